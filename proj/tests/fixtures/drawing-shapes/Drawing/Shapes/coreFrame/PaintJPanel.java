package Drawing.Shapes.coreFrame;

import java.awt.Color;
import java.awt.Graphics;
import java.awt.event.MouseAdapter;
import java.awt.event.MouseEvent;
import java.util.ArrayList;
import javax.swing.JPanel;
import Drawing.Shapes.coreElements.MyLine;
import Drawing.Shapes.coreElements.MyOval;
import Drawing.Shapes.coreElements.MyRectangle;

public class PaintJPanel extends JPanel {
    private ArrayList shapes;
    private MyShape currentShape;
    private int currentShapeType;
    private Color currentShapeColor;

    public PaintJPanel() {
        shapes = new ArrayList();
        currentShapeType = 0;
        currentShapeColor = Color.BLACK;
        setBackground(Color.WHITE);
        addMouseListener(new MouseAdapter());
        addMouseMotionListener(new MouseAdapter());
    }

    public void setCurrentShapeType(int type) {
        currentShapeType = type;
    }

    public void setCurrentShapeColor(Color color) {
        currentShapeColor = color;
    }

    public void paintJPanelMousePressed(MouseEvent event) {
        int x = event.getX();
        int y = event.getY();
        switch (currentShapeType) {
            case 0:
                currentShape = new MyLine(x, y, x, y, currentShapeColor);
                break;
            case 1:
                currentShape = new MyRectangle(x, y, x, y, currentShapeColor);
                break;
            default:
                currentShape = new MyOval(x, y, x, y, currentShapeColor);
                break;
        }
        shapes.add(currentShape);
    }

    public void paintJPanelMouseDragged(MouseEvent event) {
        if (currentShape != null) {
            currentShape.setX2(event.getX());
            currentShape.setY2(event.getY());
            repaint();
        }
    }

    public void paintComponent(Graphics g) {
        super.paintComponent(g);
        for (int i = 0; i < shapes.size(); i++) {
            MyShape shape = (MyShape) shapes.get(i);
            shape.draw(g);
        }
        if (currentShape != null) {
            currentShape.draw(g);
        }
    }
}
